// Pattern: P12 basic3receive
// Expected: Deadlock
//
// Two results are sent but main receives three.
package main

import "fmt"

func sum(s []int, c chan int) {
	total := 0
	for _, v := range s {
		total += v
	}
	c <- total
}

func main() {
	c := make(chan int)
	go sum([]int{7, 2, 8}, c)
	go sum([]int{-9, 4, 0}, c)
	x, y, z := <-c, <-c, <-c
	fmt.Println(x, y, z)
}
