// Pattern: P11 basic-receiveInFunction-extra
// Expected: Deadlock
//
// As P2, but the receiving function listens on a channel nobody sends to.
package main

import "fmt"

func sum(s []int, c chan int) {
	total := 0
	for _, v := range s {
		total += v
	}
	c <- total
}

func average(c chan float64, done chan bool) {
	x := <-c
	y := <-c
	fmt.Println((x + y) / 2)
	done <- true
}

func main() {
	ints := make(chan int)
	floats := make(chan float64)
	done := make(chan bool)
	go sum([]int{7, 2, 8}, ints)
	go sum([]int{-9, 4, 0}, ints)
	go average(floats, done)
	<-done
}
