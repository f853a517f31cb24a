// Pattern: P17 return-channel
// Expected: Deadlock
//
// A function returns a channel fed by one send; the caller receives twice.
package main

import "fmt"

func producer() chan int {
	ch := make(chan int)
	go func() {
		ch <- 1
	}()
	return ch
}

func main() {
	ch := producer()
	fmt.Println(<-ch)
	fmt.Println(<-ch)
}
